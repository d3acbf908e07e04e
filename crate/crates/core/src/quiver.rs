//! Quivers of `m`-triangulated triangles, amalgamation, the `D_n` and `Z_n`
//! quivers, flips as mutation sequences and the permutation `σ`.
//!
//! Lattice points of a triangle are weight triples `[w0, w1, w2]` summing to
//! `m`, one weight per corner. Corners are listed clockwise; side `k` runs
//! from corner `k` to corner `k + 1` and holds the points with `w_{k+2} = 0`.
//! Every up-triangle `u` (weights summing to `m - 1`) contributes the arrows
//! `u+e0 → u+e1 → u+e2 → u+e0`; arrows along a side get weight `1/2`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::qtorus::Seed;
use crate::Error;

pub type Weights = [usize; 3];

fn is_corner(m: usize, w: &Weights) -> bool {
    w.contains(&m)
}

fn same_side(a: &Weights, b: &Weights) -> bool {
    (0..3).any(|k| a[k] == 0 && b[k] == 0)
}

/// Non-corner lattice points, sorted by `w0` then `w1`, both descending.
pub fn lattice_points(m: usize) -> Vec<Weights> {
    let mut pts = Vec::new();
    for a in (0..=m).rev() {
        for b in (0..=m - a).rev() {
            let w = [a, b, m - a - b];
            if !is_corner(m, &w) {
                pts.push(w);
            }
        }
    }
    pts
}

/// Calls `f(x, y, 2ε_xy)` for every arrow contributed by a single triangle.
fn triangle_arrows<F: FnMut(&Weights, &Weights, i64)>(m: usize, mut f: F) {
    if m == 0 {
        return;
    }
    for a in 0..m {
        for b in 0..m - a {
            let u = [a, b, m - 1 - a - b];
            let p: Vec<Weights> = (0..3)
                .map(|k| {
                    let mut w = u;
                    w[k] += 1;
                    w
                })
                .collect();
            for k in 0..3 {
                let (x, y) = (&p[k], &p[(k + 1) % 3]);
                if is_corner(m, x) || is_corner(m, y) {
                    continue;
                }
                f(x, y, if same_side(x, y) { 1 } else { 2 });
            }
        }
    }
}

/// The quiver of a single `m`-triangulated triangle.
#[derive(Clone, Debug)]
pub struct TriangleQuiver {
    pub m: usize,
    pub seed: Seed,
    /// Weights of each vertex.
    pub points: Vec<Weights>,
    /// Vertices on side `k`, ordered from corner `k` towards corner `k + 1`.
    pub boundary: [Vec<usize>; 3],
}

impl TriangleQuiver {
    pub fn vertex(&self, w: &Weights) -> Option<usize> {
        self.points.iter().position(|p| p == w)
    }
}

pub fn build_triangle(m: usize) -> Result<TriangleQuiver, Error> {
    if m == 0 {
        return Err(Error::BadShape("m must be positive".into()));
    }
    let points = lattice_points(m);
    let index: BTreeMap<Weights, usize> = points.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut seed = Seed::new(points.len());
    for (i, w) in points.iter().enumerate() {
        seed.set_frozen(i, w.contains(&0));
        seed.set_label(i, format!("({},{},{})", w[0], w[1], w[2]));
    }
    triangle_arrows(m, |x, y, w2| seed.add_eps2(index[x], index[y], w2));
    let boundary = core::array::from_fn(|k| {
        let mut side: Vec<usize> = (0..points.len()).filter(|&i| points[i][(k + 2) % 3] == 0).collect();
        side.sort_by(|&x, &y| points[y][k].cmp(&points[x][k]));
        side
    });
    Ok(TriangleQuiver { m, seed, points, boundary })
}

/// Where a vertex of an amalgamated quiver comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Left(usize),
    Right(usize),
    Both(usize, usize),
}

#[derive(Clone, Debug)]
pub struct AmalgamationMap {
    pub left: Seed,
    pub right: Seed,
    pub glue: Vec<(usize, usize)>,
    pub result: Seed,
    pub embed: Vec<Origin>,
    pub left_to_result: Vec<usize>,
    pub right_to_result: Vec<usize>,
}

/// Glues `right` onto `left` along the frozen pairs in `glue`.
///
/// Left vertices keep their ids; the unglued right vertices follow in order.
pub fn amalgamate(left: &Seed, right: &Seed, glue: &[(usize, usize)], unfreeze: bool) -> Result<AmalgamationMap, Error> {
    let mut seen_l = BTreeSet::new();
    let mut seen_r = BTreeSet::new();
    for &(l, r) in glue {
        if l >= left.len() {
            return Err(Error::BadVertex(l));
        }
        if r >= right.len() {
            return Err(Error::BadVertex(r));
        }
        if !left.is_frozen(l) || !right.is_frozen(r) {
            return Err(Error::BadShape(format!("glued pair ({},{}) is not frozen", l, r)));
        }
        if !seen_l.insert(l) || !seen_r.insert(r) {
            return Err(Error::BadShape("glue is not a bijection".into()));
        }
    }
    let glued_r: BTreeMap<usize, usize> = glue.iter().map(|&(l, r)| (r, l)).collect();
    let mut right_to_result = vec![0; right.len()];
    let mut next = left.len();
    for (r, slot) in right_to_result.iter_mut().enumerate() {
        *slot = match glued_r.get(&r) {
            Some(&l) => l,
            None => {
                next += 1;
                next - 1
            }
        };
    }
    let mut result = Seed::new(next);
    let mut embed: Vec<Origin> = (0..left.len()).map(Origin::Left).collect();
    embed.resize(next, Origin::Left(0));
    for i in 0..left.len() {
        result.set_frozen(i, left.is_frozen(i));
        result.set_label(i, left.label(i).into());
        for j in 0..left.len() {
            if i < j {
                result.add_eps2(i, j, left.eps2(i, j));
            }
        }
    }
    for r in 0..right.len() {
        let v = right_to_result[r];
        match glued_r.get(&r) {
            Some(&l) => {
                embed[v] = Origin::Both(l, r);
                result.set_frozen(v, !unfreeze);
            }
            None => {
                embed[v] = Origin::Right(r);
                result.set_frozen(v, right.is_frozen(r));
                result.set_label(v, right.label(r).into());
            }
        }
        for s in r + 1..right.len() {
            result.add_eps2(v, right_to_result[s], right.eps2(r, s));
        }
    }
    Ok(AmalgamationMap {
        left: left.clone(),
        right: right.clone(),
        glue: glue.to_vec(),
        result,
        embed,
        left_to_result: (0..left.len()).collect(),
        right_to_result,
    })
}

pub fn theta(n: usize, i: usize) -> usize {
    n + 1 - i
}

/// The `D_n` quiver with its `V` and `Λ` labels.
///
/// Vertex order: `V_{1,-1}, V_{1,0}, V_{1,1}, V_{2,-2}, …, V_{n,n}`, then
/// `Λ_{1,0}, …, Λ_{n,0}`. This agrees with the figure numbering for `n ≤ 2`.
#[derive(Clone, Debug)]
pub struct DnQuiver {
    pub n: usize,
    pub seed: Seed,
    v: BTreeMap<(usize, i64), usize>,
    l: BTreeMap<(usize, i64), usize>,
}

impl DnQuiver {
    /// `V_{i,r}`, `1 ≤ i ≤ n`, `|r| ≤ i`.
    pub fn v(&self, i: usize, r: i64) -> usize {
        self.v[&(i, r)]
    }

    /// `Λ_{j,s}`, `1 ≤ j ≤ n`, `|s| ≤ j`.
    pub fn lam(&self, j: usize, s: i64) -> usize {
        self.l[&(j, s)]
    }

    /// The `V_i`-path `V_{i,-i} → … → V_{i,i}`.
    pub fn v_path(&self, i: usize) -> Vec<usize> {
        (-(i as i64)..=i as i64).map(|r| self.v(i, r)).collect()
    }

    pub fn lam_path(&self, j: usize) -> Vec<usize> {
        (-(j as i64)..=j as i64).map(|s| self.lam(j, s)).collect()
    }
}

pub fn dn_vertex_count(n: usize) -> usize {
    n * n + 3 * n
}

fn dn_index(n: usize, key: DnKey) -> usize {
    match key {
        DnKey::V(i, r) => i * i - 1 + (r + i as i64) as usize,
        DnKey::L0(j) => n * (n + 2) + j - 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DnKey {
    V(usize, i64),
    L0(usize),
}

/// Label of a point of the left triangle `(A, B, P)`.
fn dn_left_key(m: usize, w: &Weights) -> DnKey {
    if w[0] >= 1 {
        DnKey::V(m - w[0], -(w[1] as i64))
    } else {
        DnKey::L0(w[2])
    }
}

/// Label of a point of the right triangle `(A, P, B)`.
fn dn_right_key(m: usize, w: &Weights) -> DnKey {
    if w[0] >= 1 {
        DnKey::V(m - w[0], w[2] as i64)
    } else {
        DnKey::L0(w[1])
    }
}

pub fn build_dn(n: usize) -> Result<DnQuiver, Error> {
    if n == 0 {
        return Err(Error::BadShape("rank must be positive".into()));
    }
    let m = n + 1;
    let t = build_triangle(m)?;
    // left (A, B, P) and right (A, P, B), glued along AP and BP
    let mut glue = Vec::new();
    for (i, w) in t.points.iter().enumerate() {
        if w[1] == 0 {
            glue.push((i, t.vertex(&[w[0], w[2], 0]).unwrap()));
        } else if w[0] == 0 {
            glue.push((i, t.vertex(&[0, w[2], w[1]]).unwrap()));
        }
    }
    let am = amalgamate(&t.seed, &t.seed, &glue, true)?;
    let mut perm = vec![0; am.result.len()];
    for (v, o) in am.embed.iter().enumerate() {
        let key = match *o {
            Origin::Left(l) | Origin::Both(l, _) => dn_left_key(m, &t.points[l]),
            Origin::Right(r) => dn_right_key(m, &t.points[r]),
        };
        perm[v] = dn_index(n, key);
    }
    let mut seed = am.result.permuted(&perm);
    let mut v = BTreeMap::new();
    let mut l = BTreeMap::new();
    for i in 1..=n {
        for r in -(i as i64)..=i as i64 {
            let id = dn_index(n, DnKey::V(i, r));
            v.insert((i, r), id);
            seed.set_label(id, format!("V_{{{},{}}}", i, r));
        }
    }
    for j in 1..=n {
        let id = dn_index(n, DnKey::L0(j));
        l.insert((j, 0), id);
        seed.set_label(id, format!("Λ_{{{},0}}", j));
        // Λ_{j,s} read off the triangles: s < 0 on the right, s > 0 on the left
        for s in 1..=j {
            let right = [s, j - s, m - j];
            let left = [s, m - j, j - s];
            l.insert((j, -(s as i64)), dn_index(n, dn_right_key(m, &right)));
            l.insert((j, s as i64), dn_index(n, dn_left_key(m, &left)));
        }
    }
    Ok(DnQuiver { n, seed, v, l })
}

/// Two `D_n` quivers glued along `V^L_{i,i} = V^R_{i,-i}`.
///
/// Vertex order: for each `i`, the `VV_i`-path `V^L_{i,-i}, …, V^L_{i,i-1},
/// V^L_{i,i} = V^R_{i,-i}, V^R_{i,1-i}, …, V^R_{i,i}`; then `Λ^L_{j,0}` and
/// `Λ^R_{j,0}`. For `n = 2` this is the figure numbering.
#[derive(Clone, Debug)]
pub struct ZnQuiver {
    pub n: usize,
    pub d: DnQuiver,
    pub seed: Seed,
    /// `D_n` vertex to `Z_n` vertex, for the left and right copy.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub sigma: Vec<usize>,
    pub surface: Triangulation,
    pub arcs: ZnArcs,
}

/// Arc ids of the initial triangulation of the twice punctured disk.
///
/// `a` and `g` are the boundary arcs, `b, c` join the left puncture to the
/// top and bottom marked points, `e, f` do the same for the right puncture,
/// and `v` separates the punctures.
#[derive(Clone, Copy, Debug)]
pub struct ZnArcs {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub g: usize,
}

pub fn zn_vertex_count(n: usize) -> usize {
    2 * n * n + 5 * n
}

impl ZnQuiver {
    /// The `VV_i`-path.
    pub fn vv_path(&self, i: usize) -> Vec<usize> {
        let mut p: Vec<usize> = self.d.v_path(i).iter().map(|&x| self.left[x]).collect();
        p.extend(self.d.v_path(i).iter().skip(1).map(|&x| self.right[x]));
        p
    }

    /// The `ΛΛ_j`-path: `Λ^R_j` followed by `Λ^L_j`, sharing the glued vertex.
    pub fn ll_path(&self, j: usize) -> Vec<usize> {
        let mut p: Vec<usize> = self.d.lam_path(j).iter().map(|&x| self.right[x]).collect();
        p.extend(self.d.lam_path(j).iter().skip(1).map(|&x| self.left[x]));
        p
    }

    /// `σ` applied to a seed: vertex `v` becomes `σ(v)`.
    pub fn apply_sigma(&self, s: &Seed) -> Seed {
        s.permuted(&self.sigma)
    }
}

pub fn apply_sigma(z: &ZnQuiver, s: &Seed) -> Seed {
    z.apply_sigma(s)
}

pub fn build_zn(n: usize) -> Result<ZnQuiver, Error> {
    let d = build_dn(n)?;
    let glue: Vec<(usize, usize)> = (1..=n).map(|i| (d.v(i, i as i64), d.v(i, -(i as i64)))).collect();
    let am = amalgamate(&d.seed, &d.seed, &glue, true)?;
    let dn = d.seed.len();
    // canonical order
    let mut order = Vec::new();
    for i in 1..=n {
        let ii = i as i64;
        for r in -ii..ii {
            order.push(am.left_to_result[d.v(i, r)]);
        }
        order.push(am.left_to_result[d.v(i, ii)]);
        for r in 1 - ii..=ii {
            order.push(am.right_to_result[d.v(i, r)]);
        }
    }
    for j in 1..=n {
        order.push(am.left_to_result[d.lam(j, 0)]);
    }
    for j in 1..=n {
        order.push(am.right_to_result[d.lam(j, 0)]);
    }
    debug_assert_eq!(order.len(), am.result.len());
    let mut perm = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let mut seed = am.result.permuted(&perm);
    let left: Vec<usize> = (0..dn).map(|x| perm[am.left_to_result[x]]).collect();
    let right: Vec<usize> = (0..dn).map(|x| perm[am.right_to_result[x]]).collect();
    for x in 0..dn {
        seed.set_label(left[x], format!("{}^L", d.seed.label(x)));
        if !glue.iter().any(|g| g.1 == x) {
            seed.set_label(right[x], format!("{}^R", d.seed.label(x)));
        }
    }
    let (surface, arcs) = zn_surface(n, &d, &left, &right);
    let mut z = ZnQuiver { n, d, seed, left, right, sigma: Vec::new(), surface, arcs };
    z.sigma = sigma_from_cycles(&z)?;
    Ok(z)
}

/// The four triangles `(A,B,P1)`, `(A,P1,B)`, `(A,B,P2)`, `(A,P2,B)` with
/// their points mapped to `Z_n` vertices.
fn zn_surface(n: usize, d: &DnQuiver, left: &[usize], right: &[usize]) -> (Triangulation, ZnArcs) {
    let m = n + 1;
    let (pa, pb, p1, p2) = (0, 1, 2, 3);
    let arcs = ZnArcs { a: 0, b: 1, c: 2, v: 3, e: 4, f: 5, g: 6 };
    let key_id = |key: DnKey| dn_index(n, key);
    let _ = d;
    let mk = |corners: [usize; 3], sides: [usize; 3], is_left_tri: bool, side_map: &[usize]| {
        let mut points = BTreeMap::new();
        for w in lattice_points(m) {
            let key = if is_left_tri { dn_left_key(m, &w) } else { dn_right_key(m, &w) };
            points.insert(w, side_map[key_id(key)]);
        }
        Triangle { corners, sides, points }
    };
    let tris = vec![
        mk([pa, pb, p1], [arcs.a, arcs.b, arcs.c], true, left),
        mk([pa, p1, pb], [arcs.c, arcs.b, arcs.v], false, left),
        mk([pa, pb, p2], [arcs.v, arcs.e, arcs.f], true, right),
        mk([pa, p2, pb], [arcs.f, arcs.e, arcs.g], false, right),
    ];
    (Triangulation { m, nverts: zn_vertex_count(n), tris, next_arc: 7 }, arcs)
}

/// A triangle of an ideal triangulation with its lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    /// Marked points, clockwise.
    pub corners: [usize; 3],
    /// Arc ids; side `k` runs from corner `k` to corner `k + 1`.
    pub sides: [usize; 3],
    pub points: BTreeMap<Weights, usize>,
}

impl Triangle {
    /// The same triangle with corner `k` moved to position 0.
    pub fn rotated(&self, k: usize) -> Triangle {
        let corners = core::array::from_fn(|i| self.corners[(i + k) % 3]);
        let sides = core::array::from_fn(|i| self.sides[(i + k) % 3]);
        let points = self.points.iter().map(|(w, &v)| ([w[k % 3], w[(k + 1) % 3], w[(k + 2) % 3]], v)).collect();
        Triangle { corners, sides, points }
    }

    pub fn side_of(&self, arc: usize) -> Option<usize> {
        self.sides.iter().position(|&s| s == arc)
    }

    /// The path parallel to side `k` at distance `level` from it, following
    /// the arrow orientation (from the corner-`k` end to the corner-`k+1` end).
    pub fn path(&self, k: usize, level: usize) -> Vec<usize> {
        let mut pts: Vec<(&Weights, usize)> = self.points.iter().filter(|(w, _)| w[(k + 2) % 3] == level).map(|(w, &v)| (w, v)).collect();
        pts.sort_by(|a, b| b.0[k].cmp(&a.0[k]));
        pts.into_iter().map(|(_, v)| v).collect()
    }
}

/// An `m`-triangulated ideal triangulation whose lattice points carry
/// quiver vertices. Points on shared arcs carry the same vertex.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub m: usize,
    pub nverts: usize,
    pub tris: Vec<Triangle>,
    next_arc: usize,
}

/// Vertices to mutate in each rectangle-step of a flip.
pub type FlipSteps = Vec<Vec<usize>>;

impl Triangulation {
    /// Two triangles glued along their diagonal, on the square model
    /// `[0,m]²`: corners `C3 = (0,0)`, `C1 = (m,0)`, `C2 = (0,m)`,
    /// `D = (m,m)`, diagonal `C1C2` (arc 0). Point `(x, y)` gets the id
    /// obtained by sorting on `x + y` ascending, then `x - y` descending.
    pub fn quad(m: usize) -> Triangulation {
        let mut pos: Vec<(usize, usize)> = Vec::new();
        for x in 0..=m {
            for y in 0..=m {
                if (x, y) != (0, 0) && (x, y) != (m, 0) && (x, y) != (0, m) && (x, y) != (m, m) {
                    pos.push((x, y));
                }
            }
        }
        pos.sort_by(|a, b| (a.0 + a.1).cmp(&(b.0 + b.1)).then((b.0 as i64 - b.1 as i64).cmp(&(a.0 as i64 - a.1 as i64))));
        let id: BTreeMap<(usize, usize), usize> = pos.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let (c1, c2, c3, dd) = (0, 1, 2, 3);
        let mut t = Triangle { corners: [c1, c2, c3], sides: [0, 1, 2], points: BTreeMap::new() };
        let mut t2 = Triangle { corners: [c2, c1, dd], sides: [0, 3, 4], points: BTreeMap::new() };
        for (&(x, y), &v) in &id {
            if x + y <= m {
                t.points.insert([x, y, m - x - y], v);
            }
            if x + y >= m {
                t2.points.insert([m - x, m - y, x + y - m], v);
            }
        }
        Triangulation { m, nverts: pos.len(), tris: vec![t, t2], next_arc: 5 }
    }

    fn arc_uses(&self) -> BTreeMap<usize, usize> {
        let mut uses = BTreeMap::new();
        for t in &self.tris {
            for &s in &t.sides {
                *uses.entry(s).or_insert(0) += 1;
            }
        }
        uses
    }

    /// The quiver: per-triangle arrows added up; points on arcs bounding a
    /// single triangle are frozen.
    pub fn quiver(&self) -> Seed {
        let m = self.m;
        let mut s = Seed::new(self.nverts);
        let uses = self.arc_uses();
        for t in &self.tris {
            triangle_arrows(m, |x, y, w2| s.add_eps2(t.points[x], t.points[y], w2));
            for k in 0..3 {
                if uses[&t.sides[k]] == 1 {
                    for (w, &v) in &t.points {
                        if w[(k + 2) % 3] == 0 {
                            s.set_frozen(v, true);
                        }
                    }
                }
            }
        }
        s
    }

    /// Triangles containing `arc`, as (triangle index, side index).
    fn sides_of(&self, arc: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ti, t) in self.tris.iter().enumerate() {
            for k in 0..3 {
                if t.sides[k] == arc {
                    out.push((ti, k));
                }
            }
        }
        out
    }

    /// Flips `arc`. Returns the rectangle-steps (vertices ascending within
    /// a step) and the id of the new arc. Points keep their vertices.
    pub fn flip(&mut self, arc: usize) -> Result<(FlipSteps, usize), Error> {
        let m = self.m;
        let occ = self.sides_of(arc);
        if occ.len() != 2 || occ[0].0 == occ[1].0 {
            return Err(Error::BadShape(format!("arc {} is not a diagonal of a 4-gon", arc)));
        }
        let t = self.tris[occ[0].0].rotated(occ[0].1);
        let t2 = self.tris[occ[1].0].rotated(occ[1].1);
        let (c1, c2, c3, dd) = (t.corners[0], t.corners[1], t.corners[2], t2.corners[2]);
        if t2.corners[0] != c2 || t2.corners[1] != c1 {
            return Err(Error::BadShape("triangles disagree on the diagonal".into()));
        }
        let id = |x: usize, y: usize| -> Result<usize, Error> {
            let v = if x + y <= m { t.points.get(&[x, y, m - x - y]) } else { t2.points.get(&[m - x, m - y, x + y - m]) };
            v.copied().ok_or_else(|| Error::BadShape(format!("no point at ({},{})", x, y)))
        };
        for x in 1..m {
            if id(x, m - x)? != t2.points[&[m - x, x, 0]] {
                return Err(Error::BadShape("diagonal points disagree".into()));
            }
        }
        let mut steps = Vec::new();
        for i in 1..m {
            let mut step = Vec::new();
            for a in 0..m - i {
                for b in 0..i {
                    step.push(id(m - i - a + b, a + b + 1)?);
                }
            }
            step.sort_unstable();
            steps.push(step);
        }
        let new_arc = self.next_arc;
        self.next_arc += 1;
        let mut n1 = Triangle { corners: [c3, c1, dd], sides: [t.sides[2], t2.sides[1], new_arc], points: BTreeMap::new() };
        let mut n2 = Triangle { corners: [dd, c2, c3], sides: [t2.sides[2], t.sides[1], new_arc], points: BTreeMap::new() };
        for x in 0..=m {
            for y in 0..=m {
                let corner = (x == 0 || x == m) && (y == 0 || y == m);
                if corner {
                    continue;
                }
                let v = id(x, y)?;
                if y <= x {
                    n1.points.insert([m - x, x - y, y], v);
                }
                if y >= x {
                    n2.points.insert([x, y - x, m - y], v);
                }
            }
        }
        let (i0, i1) = (occ[0].0, occ[1].0);
        self.tris[i0] = n1;
        self.tris[i1] = n2;
        Ok((steps, new_arc))
    }

    pub fn triangle_with(&self, arcs: &[usize]) -> Option<&Triangle> {
        self.tris.iter().find(|t| arcs.iter().all(|a| t.sides.contains(a)))
    }
}

/// A mutation sequence grouped into flips and rectangle-steps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MutationSchedule {
    pub steps: Vec<usize>,
    pub flips: Vec<FlipSteps>,
}

impl MutationSchedule {
    pub fn from_flips(flips: Vec<FlipSteps>) -> Self {
        let steps = flips.iter().flatten().flatten().copied().collect();
        MutationSchedule { steps, flips }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// The flip of the diagonal `arc` of a triangulated 4-gon.
pub fn flip_schedule(surface: &Triangulation, arc: usize) -> Result<MutationSchedule, Error> {
    let mut s = surface.clone();
    let (steps, _) = s.flip(arc)?;
    Ok(MutationSchedule::from_flips(vec![steps]))
}

/// The half-Dehn twist: flip the arc between the punctures, then the two
/// arcs `b` and `f`, then the arc between the punctures again.
pub fn half_dehn_schedule(z: &ZnQuiver) -> Result<(MutationSchedule, Triangulation), Error> {
    let mut s = z.surface.clone();
    let (f1, d) = s.flip(z.arcs.v)?;
    let (f2, _) = s.flip(z.arcs.b)?;
    let (f3, _) = s.flip(z.arcs.f)?;
    let (f4, _) = s.flip(d)?;
    Ok((MutationSchedule::from_flips(vec![f1, f2, f3, f4]), s))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Builds `σ` from the permutation cycles drawn on the triangulation after
/// the first flip.
fn sigma_from_cycles(z: &ZnQuiver) -> Result<Vec<usize>, Error> {
    let n = z.n;
    let m = n + 1;
    let arcs = z.arcs;
    let mut s = z.surface.clone();
    let (_, d) = s.flip(arcs.v)?;
    let find = |a1: usize, a2: usize| -> Result<Triangle, Error> {
        s.triangle_with(&[a1, a2]).cloned().ok_or_else(|| Error::BadShape("missing triangle".into()))
    };
    let abc = find(arcs.a, arcs.b)?;
    let bde = find(arcs.b, d)?;
    let efg = find(arcs.e, arcs.g)?;
    let cdf = find(arcs.c, d)?;
    let mut sigma: Vec<Option<usize>> = vec![None; z.seed.len()];
    for i in 1..=n {
        let mut cycle = abc.path(abc.side_of(arcs.a).unwrap(), i);
        for (t, arc, along) in [(&bde, d, false), (&efg, arcs.g, true), (&cdf, d, false)] {
            let k = t.side_of(arc).unwrap();
            let last = *cycle.last().unwrap();
            let mut seg = None;
            for level in 1..m {
                let mut p = t.path(k, level);
                if !along {
                    p.reverse();
                }
                if p.first() == Some(&last) {
                    seg = Some(p);
                }
            }
            let seg = seg.ok_or_else(|| Error::BadShape("permutation cycle does not continue".into()))?;
            cycle.extend_from_slice(&seg[1..]);
        }
        if cycle.first() != cycle.last() {
            return Err(Error::BadShape("permutation cycle does not close".into()));
        }
        cycle.pop();
        let len = cycle.len();
        for (k, &v) in cycle.iter().enumerate() {
            if sigma[v].is_some() {
                return Err(Error::BadShape("permutation cycles overlap".into()));
            }
            sigma[v] = Some(cycle[(k + i) % len]);
        }
    }
    for (v, slot) in sigma.iter_mut().enumerate() {
        if z.seed.is_frozen(v) {
            *slot = Some(v);
        }
    }
    // remaining vertices sit on the arc between the punctures; rotate them
    let k = bde.side_of(d).unwrap();
    let on_d: BTreeMap<usize, usize> = bde.points.iter().filter(|(w, _)| w[(k + 2) % 3] == 0).map(|(w, &v)| (w[k], v)).collect();
    for (&wk, &v) in &on_d {
        if sigma[v].is_none() {
            sigma[v] = Some(on_d[&(m - wk)]);
        }
    }
    sigma.into_iter().collect::<Option<Vec<usize>>>().ok_or_else(|| Error::BadShape("σ is not total".into()))
}

/// All bijections `π` with `b.eps2(π(i), π(j)) = a.eps2(i, j)` and
/// `π(v) = v` for each `v` in `fixed`, up to `limit` of them.
pub fn quiver_isomorphisms(a: &Seed, b: &Seed, fixed: &[usize], limit: usize) -> Vec<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return Vec::new();
    }
    let sig = |s: &Seed, i: usize| {
        let mut row: Vec<i64> = (0..n).map(|j| s.eps2(i, j)).collect();
        row.sort_unstable();
        (s.is_frozen(i), row)
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    // fixed vertices first, then breadth-first along arrows
    let mut order: Vec<usize> = fixed.to_vec();
    let mut placed = vec![false; n];
    for &f in fixed {
        placed[f] = true;
    }
    let mut head = 0;
    while order.len() < n {
        if head == order.len() {
            let start = (0..n).find(|&v| !placed[v]).unwrap();
            placed[start] = true;
            order.push(start);
        }
        let u = order[head];
        head += 1;
        for v in 0..n {
            if !placed[v] && a.eps2(u, v) != 0 {
                placed[v] = true;
                order.push(v);
            }
        }
    }
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    iso_search(a, b, &order, 0, fixed, &sa, &sb, &mut map, &mut used, &mut out, limit);
    out
}

#[allow(clippy::too_many_arguments)]
fn iso_search(
    a: &Seed,
    b: &Seed,
    order: &[usize],
    depth: usize,
    fixed: &[usize],
    sa: &[(bool, Vec<i64>)],
    sb: &[(bool, Vec<i64>)],
    map: &mut [usize],
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if depth == order.len() {
        out.push(map.to_vec());
        return;
    }
    let u = order[depth];
    let candidates: Vec<usize> = if fixed.contains(&u) { vec![u] } else { (0..map.len()).collect() };
    for c in candidates {
        if used[c] || sa[u] != sb[c] {
            continue;
        }
        let ok = order[..depth].iter().all(|&w| a.eps2(u, w) == b.eps2(c, map[w]));
        if !ok {
            continue;
        }
        map[u] = c;
        used[c] = true;
        iso_search(a, b, order, depth + 1, fixed, sa, sb, map, used, out, limit);
        used[c] = false;
        map[u] = usize::MAX;
    }
}

/// Renders labels in the form used by the figures: 1-based vertex numbers.
pub fn figure_label(v: usize) -> String {
    format!("{}", v + 1)
}
